#!/usr/bin/env python3
import os
import sys


# Make `src` importable from a checkout and from a PyInstaller bundle
def _prepare_path():
    project_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
    if project_dir not in sys.path:
        sys.path.insert(0, project_dir)
    if getattr(sys, 'frozen', False) and hasattr(sys, '_MEIPASS'):
        bundle_dir = sys._MEIPASS
        if os.path.isdir(os.path.join(bundle_dir, 'src')) and bundle_dir not in sys.path:
            sys.path.insert(0, bundle_dir)


def main(argv=None):
    _prepare_path()
    from src.cli import main as cli_main
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())

import sys

from signforms.cli import main

if __name__ == "__main__":
    sys.exit(main())

import sys

from qmaj.cli import main

sys.exit(main())

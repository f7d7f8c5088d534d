import sys

from mulfrac.cli import main

sys.exit(main())

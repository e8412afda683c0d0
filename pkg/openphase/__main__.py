import sys

from openphase.cli import main

sys.exit(main())

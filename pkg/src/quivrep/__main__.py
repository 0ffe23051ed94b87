import sys

from quivrep.cli import main

sys.exit(main())

import sys

from mpg_duel.cli import main

sys.exit(main())

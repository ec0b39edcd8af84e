import sys

from noether_kit.cli import main

sys.exit(main())

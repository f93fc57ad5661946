import sys

from purposegraph.cli import main

sys.exit(main())

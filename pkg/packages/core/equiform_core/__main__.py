import sys

from equiform_core.cli import main

sys.exit(main())

import sys

from beliefdyn.main import main

sys.exit(main())

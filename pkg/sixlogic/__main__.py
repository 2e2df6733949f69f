import sys

from sixlogic.cli import main

sys.exit(main())

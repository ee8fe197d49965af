import sys

from fraclyap.cli import main

sys.exit(main())

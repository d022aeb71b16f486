import sys

from noisyea.cli import main

sys.exit(main())

import sys

from expdiff.cli import main

sys.exit(main())

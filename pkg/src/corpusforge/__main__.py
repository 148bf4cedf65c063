"""Allow ``python -m corpusforge``."""

import sys

from .cli import main

sys.exit(main())

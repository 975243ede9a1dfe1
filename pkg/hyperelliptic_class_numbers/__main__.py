"""Allow ``python -m hyperelliptic_class_numbers``."""

import sys

from .cli import main

sys.exit(main())

"""Allow running as: python -m src.cli"""

import sys

from src.cli.ras_cli import main

sys.exit(main())

import sys

from .render_cli import main

sys.exit(main())

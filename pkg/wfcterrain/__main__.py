import sys

from wfcterrain.cli import main

sys.exit(main())

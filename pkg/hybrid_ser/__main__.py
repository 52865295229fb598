import sys

from hybrid_ser.cli import main

sys.exit(main())

import sys

from lfun.main import main

sys.exit(main())

import sys

from zk_betti.main import main

sys.exit(main())

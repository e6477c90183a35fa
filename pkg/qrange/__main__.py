from qrange.main import main

raise SystemExit(main())

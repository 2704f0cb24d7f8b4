from tropical_jacobians.cli import main

raise SystemExit(main())

from citerec.cli import main

raise SystemExit(main())

from weylslice.cli import main

raise SystemExit(main())

from apcert.cli import main

main()

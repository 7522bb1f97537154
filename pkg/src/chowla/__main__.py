from chowla.cli import main

main()

from ktinhofer.cli import main

main()

# Unit, command line and golden-file tests

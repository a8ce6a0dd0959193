# Tests module initialization

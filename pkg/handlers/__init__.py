# Handlers module initialization

# Systems module initialization

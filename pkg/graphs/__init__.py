# Graphs module initialization

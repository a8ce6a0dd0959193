# Entropy module initialization

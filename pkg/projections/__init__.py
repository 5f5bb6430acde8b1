# Hyperslab projections

# Synthetic experiment scenarios

# Generalized thresholding operators and shrinkage rules

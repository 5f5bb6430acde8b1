# Text tables and CSV artifacts

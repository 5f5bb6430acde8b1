# APGT engine: online recursion, oracles and runner

# Monte-Carlo experiment harness

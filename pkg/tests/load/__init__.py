# Load tests for logderiv

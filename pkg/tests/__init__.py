# Tests for logderiv

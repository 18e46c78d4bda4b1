# Tests for cone-exponents

# Test package for tropical_jacobians

#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

probability_sum_tolerance = 1e-12
criticality_tolerance = 1e-9
eigen_residual_tolerance = 1e-12
eigen_check_tolerance = 1e-10
power_iteration_cap = 10**6
size_bias_tolerance = 1e-6

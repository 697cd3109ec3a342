#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

start_offset = 1e-6
fixed_point_iteration_cap = 20000
fixed_point_step_tolerance = 1e-7
residual_tolerance = 1e-12
admissibility_slack = 1e-9
criticality_tolerance = 1e-6
tangency_window = 1e-3
truncation_bound = 1e-16
truncation_degree_cap = 4000
criticality_search_tolerance = 1e-8

#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

initial_window_height = 8
window_height_cap = 1 << 14
window_vertex_cap = 2 * 10 ** 6
verify_stabilization = True

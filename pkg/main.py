#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import sys

from Harness.cli import main

if __name__ == '__main__':

    sys.exit(main())

import os
import sys

# Run the tests against the packages in this checkout rather than an
# installed tsp-sim.
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

"""Default comparison tolerances, threaded through every numeric check.

Exact-arithmetic code paths (rational weights, integer-scaled flow) do not
consume these; they exist for float inputs and solver round-off.
"""

TAU_METRIC = 1e-9
TAU_WEIGHT = 1e-9
TAU_SOLVER = 1e-8

# Ceiling for checks whose exact-arithmetic path should land on literal zero;
# float-valued variants of the same checks must stay under this.
EXACT_TOL = 1e-12

# Cap on distance-table entries (carrier size squared) for product spaces.
MAX_TABLE_ENTRIES = 1_000_000

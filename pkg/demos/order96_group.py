"""Walk through the order-96 stabiliser on C^2 x (C^3)^3.

Builds the group from its three generators, prints the nonzero traces,
and checks that the fixed space is one-dimensional and AME.
"""

from mixedstab import code_basis, code_dimension, is_ame
from mixedstab.constructions import example_7_group, trace_table

group = example_7_group()
print("order:", group.order)

rows = trace_table()
nonzero = [(w, t) for _, w, t in rows if not t.is_zero()]
print(len(nonzero), "elements with nonzero trace")
for word, t in nonzero[:12]:
    print(f"  {word:<10} {t}")
print("  ...")

# trace formula: dim = (1/|S|) sum_s tr(s)
print("code dimension:", code_dimension(group))

psi = code_basis(group).basis[0]
rep = is_ame(psi)
print("fixed state is AME:", rep.verdict, f"(max deviation {rep.max_deviation:.1e})")

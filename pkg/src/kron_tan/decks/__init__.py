"""Example netlists shipped with the package (see :func:`kron_tan.netlist.load_deck`)."""

"""Toledo invariants, Maslov-type quasimorphisms and causal orders for surface group representations."""

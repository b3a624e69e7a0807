"""Space-cost laboratory for abstract machines of the lambda calculus."""

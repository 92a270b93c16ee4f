"""
Modules Package

This package provides the domain modules: finite fields, the reduced
polynomial ring, Reed-Muller weight formulas, hyperplane arrangements,
explicit codeword constructors, exhaustive oracles and the verification
suites built on them.
"""

"""Exact computational algebra for truncated Witt vectors, cyclic-group
Mackey functors, polynomial Witt vectors, de Rham-Witt complexes and
trace-theory checks."""

__version__ = "0.1.0"

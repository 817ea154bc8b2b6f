"""A synchronous pi-calculus toolkit.

``spicalc.syntax`` turns source text into typed canonical programs and
``spicalc.lts`` builds their labelled transition systems.  On top of these,
``spicalc.equiv`` decides weak bisimilarity and ``spicalc.analysis`` checks
determinacy and confluence.
"""
__version__ = "0.1.0"

"""Maps of cities whose paper output and citation impact exceed expectation.

Pipeline: tagged WoS exports -> city occurrences -> citation percentiles ->
observed/expected tests -> styled map overlays and tables.
"""

__version__ = "0.1.0"

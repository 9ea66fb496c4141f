"""Strong spatial mixing certificates and heat-bath dynamics for 5-colourings of the kagome lattice."""

__version__ = "0.1.0"

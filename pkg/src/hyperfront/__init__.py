"""Front tracking for steady hypersonic similarity flows."""

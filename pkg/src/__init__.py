"""Abstention-aware ASR evaluation toolkit."""

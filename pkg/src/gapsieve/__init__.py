"""Admissible prime k-tuples, segmented sieving, sieve-weight laboratory, and
the explicit constants chain behind a bounded-gap two-primes-plus-almost-prime
argument."""

__version__ = "0.1.0"

#!/usr/bin/env python3
"""Regenerates the RSA key fixtures under data/keys/.

The fixtures are checked in; this script only documents how they were made.
  rsa2048_e3.json  2048-bit modulus (256 bytes), e = 3, via `cryptography`.
  rsa96_e3.json    96-bit modulus (12 bytes), e = 3, for small-modulus tests.
"""
import json
import pathlib
import random

from cryptography.hazmat.primitives.asymmetric import rsa
import sympy

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "keys"


def dump(name, n, e, d):
    doc = {
        "mod_len": (n.bit_length() + 7) // 8,
        "n": format(n, "x"),
        "e": format(e, "x"),
        "d": format(d, "x"),
    }
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def small_key(bits, rng):
    half = bits // 2
    while True:
        p = sympy.nextprime(rng.getrandbits(half) | (3 << (half - 2)))
        q = sympy.nextprime(rng.getrandbits(half) | (3 << (half - 2)))
        n = p * q
        phi = (p - 1) * (q - 1)
        if p != q and n.bit_length() == bits and sympy.gcd(3, phi) == 1:
            return n, 3, pow(3, -1, phi)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    key = rsa.generate_private_key(public_exponent=3, key_size=2048)
    priv = key.private_numbers()
    dump("rsa2048_e3.json", priv.public_numbers.n, priv.public_numbers.e, priv.d)
    n, e, d = small_key(96, random.Random(20240501))
    dump("rsa96_e3.json", n, e, d)


if __name__ == "__main__":
    main()

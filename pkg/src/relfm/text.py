"""Text ingestion: byte-to-code alphabets, suffix arrays, BWT, symbol counts.

Codes are dense uint8 with 0 reserved for the terminator appended to every
text; code order follows byte order, so comparisons over codes match the
raw bytes.  Suffix arrays use 1-based start positions at the public
boundary, matching the rest of the package.
"""

import numpy as np

DNA_SYMBOLS = b"ACGNT"


class Alphabet:
    """Dense code assignment: sentinel 0, then symbols in byte order."""

    __slots__ = ("symbols", "code_of", "catchall")

    def __init__(self, symbols, catchall=None):
        symbols = bytes(sorted(set(symbols)))
        if not symbols:
            raise ValueError("empty alphabet")
        if len(symbols) > 250:
            raise ValueError("alphabet overflow")
        table = np.zeros(256, dtype=np.uint8)
        for k, b in enumerate(symbols):
            table[b] = k + 1
        self.symbols = symbols
        self.code_of = table
        self.catchall = None
        if catchall is not None:
            code = int(table[catchall[0]])
            if code == 0:
                raise ValueError("catch-all byte not in alphabet")
            self.catchall = code

    @property
    def sigma(self):
        """Distinct codes including the sentinel."""
        return len(self.symbols) + 1

    def encode(self, data, strict=True):
        """Map bytes to codes (no terminator).

        Unknown bytes raise in strict mode; otherwise they become the
        catch-all symbol, or raise if the alphabet has none.
        """
        arr = np.frombuffer(bytes(data), dtype=np.uint8)
        codes = self.code_of[arr]
        if codes.size and codes.min() == 0:
            if strict or self.catchall is None:
                bad = int(arr[codes == 0][0])
                raise ValueError(f"byte {bad:#04x} not in alphabet")
            codes = codes.copy()
            codes[codes == 0] = self.catchall
        return codes

    def try_encode(self, data):
        """Codes for `data`, or None if any byte is outside the alphabet."""
        try:
            return self.encode(data, strict=True)
        except ValueError:
            return None

    def decode(self, codes):
        """Bytes for a sequence of nonzero codes."""
        codes = np.asarray(codes, dtype=np.uint8)
        if codes.size and (codes.min() < 1 or codes.max() > len(self.symbols)):
            raise ValueError("code out of alphabet")
        lut = np.frombuffer(self.symbols, dtype=np.uint8)
        return bytes(lut[codes - 1]) if codes.size else b""

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __repr__(self):
        return f"Alphabet({self.symbols!r})"


class Text:
    """Sentinel-terminated code sequence over an alphabet."""

    __slots__ = ("codes", "alphabet")

    def __init__(self, codes, alphabet):
        codes = np.ascontiguousarray(codes, dtype=np.uint8)
        if codes.size == 0 or codes[-1] != 0:
            raise ValueError("text must end with the sentinel")
        if codes.size > 1 and int(codes[:-1].min()) == 0:
            raise ValueError("sentinel only allowed at the end")
        if int(codes.max()) >= alphabet.sigma:
            raise ValueError("code out of alphabet")
        self.codes = codes
        self.alphabet = alphabet

    @property
    def n(self):
        """Length without the terminator."""
        return self.codes.size - 1

    def raw(self):
        return self.alphabet.decode(self.codes[:-1])

    @classmethod
    def from_bytes(cls, data, alphabet=None, strict=True):
        if len(data) == 0:
            raise ValueError("empty input")
        if alphabet is None:
            alphabet = Alphabet(set(data))
        codes = alphabet.encode(data, strict=strict)
        return cls(np.concatenate([codes, [0]]).astype(np.uint8), alphabet)


def _strip_fasta(data):
    """Residue bytes of the first FASTA record: headers dropped, upper-cased."""
    lines = data.split(b"\n")
    out = []
    seen_header = False
    for line in lines:
        line = line.strip()
        if line.startswith(b">"):
            if seen_header:
                break
            seen_header = True
            continue
        if line:
            out.append(line)
    return b"".join(out).upper()


def load_text(data, format="plain", alphabet=None):
    """Build a Text from raw input bytes.

    `format` is "plain" (bytes used as-is, alphabet = observed bytes unless
    given) or "fasta" (first record only, DNA alphabet with N as the
    catch-all for unknown residues).
    """
    if format == "fasta":
        payload = _strip_fasta(data)
        if alphabet is None:
            alphabet = Alphabet(DNA_SYMBOLS, catchall=b"N")
        strict = False
    elif format == "plain":
        payload = bytes(data)
        strict = True
    else:
        raise ValueError(f"unknown format {format!r}")
    if not payload:
        raise ValueError("empty input")
    return Text.from_bytes(payload, alphabet=alphabet, strict=strict)


def suffix_array(codes):
    """1-based start positions of suffixes in sorted order.

    Prefix doubling over numpy lexsort; `codes` must be sentinel-terminated
    (unique smallest code 0 at the end), which keeps rank ties finite.
    """
    arr = np.asarray(codes, dtype=np.int64)
    n = arr.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if arr[-1] != 0:
        raise ValueError("text must end with the sentinel")
    rank = arr.copy()
    k = 1
    while True:
        key2 = np.zeros(n, dtype=np.int64)
        key2[: n - k] = rank[k:]
        order = np.lexsort((key2, rank))
        newrank = np.zeros(n, dtype=np.int64)
        changed = (rank[order][1:] != rank[order][:-1]) | (
            key2[order][1:] != key2[order][:-1]
        )
        newrank[order[1:]] = np.cumsum(changed)
        if newrank[order[-1]] == n - 1:
            return order.astype(np.int64) + 1
        rank = newrank
        k <<= 1


def bwt_from_sa(codes, sa):
    """Last column of the sorted rotations: codes[sa - 2 mod n]."""
    codes = np.asarray(codes, dtype=np.uint8)
    sa = np.asarray(sa, dtype=np.int64)
    return codes[(sa - 2) % codes.size]


def char_counts(codes, sigma):
    """Cumulative counts: entry a = symbols with code < a, entry sigma = total."""
    freq = np.bincount(np.asarray(codes, dtype=np.uint8), minlength=sigma)
    out = np.zeros(sigma + 1, dtype=np.int64)
    np.cumsum(freq[:sigma], out=out[1:])
    return out


def invert_bwt(bwt_codes):
    """Rebuild the sentinel-terminated text from its BWT.

    Walks the row-to-preceding-row map starting at the sentinel row,
    collecting the text right to left.
    """
    bwt = np.asarray(bwt_codes, dtype=np.uint8)
    n = bwt.size
    sigma = int(bwt.max()) + 1 if n else 1
    counts = char_counts(bwt, sigma)
    lf = np.zeros(n, dtype=np.int64)
    for a in range(sigma):
        rows = np.flatnonzero(bwt == a)
        lf[rows] = counts[a] + np.arange(rows.size)
    out = np.zeros(n, dtype=np.uint8)
    row = 0
    for k in range(n - 1, -1, -1):
        out[k - 1] = bwt[row]  # k-1 wraps the sentinel to the end
        row = lf[row]
    return out

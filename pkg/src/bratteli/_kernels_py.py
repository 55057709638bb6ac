"""Pure-Python word enumeration kernels (reference and fallback)."""


def pair_mask(word, d):
    """Bitmask of the adjacent pairs ``(x, y)`` of ``word``; bit ``x * d + y``."""
    mask = 0
    for x, y in zip(word, word[1:]):
        mask |= 1 << (x * d + y)
    return mask


def word_signatures(counts):
    """Distinct words with letter multiplicities ``counts`` grouped by signature.

    Returns ``{(first, last, pair_mask): number_of_words}``.
    """
    d = len(counts)
    left = list(counts)
    total = sum(left)
    out = {}
    if total == 0:
        return out

    def walk(prev, first, mask, placed):
        if placed == total:
            key = (first, prev, mask)
            out[key] = out.get(key, 0) + 1
            return
        for x in range(d):
            if left[x]:
                left[x] -= 1
                walk(x, first, mask | (1 << (prev * d + x)), placed + 1)
                left[x] += 1

    for x in range(d):
        if left[x]:
            left[x] -= 1
            walk(x, x, 0, 1)
            left[x] += 1
    return out


def iter_words(counts):
    """Distinct words with the given letter multiplicities, lexicographically."""
    d = len(counts)
    left = list(counts)
    total = sum(left)
    word = []

    def walk():
        if len(word) == total:
            yield tuple(word)
            return
        for x in range(d):
            if left[x]:
                left[x] -= 1
                word.append(x)
                yield from walk()
                word.pop()
                left[x] += 1

    if total:
        yield from walk()

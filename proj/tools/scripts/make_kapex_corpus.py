"""Writes the pinned k-apex corpus (tests/data/kapex_corpus.txt). Seeded; rerunning
reproduces the file byte for byte with the same networkx version."""
import random
import sys

import networkx as nx


def planar_piece(rng, n, extra):
    g = nx.Graph()
    g.add_node(0)
    for v in range(1, n):
        g.add_edge(v, rng.randrange(v))
    tries = 0
    while extra > 0 and tries < 50 * n:
        tries += 1
        u, v = rng.sample(range(n), 2)
        if g.has_edge(u, v):
            continue
        g.add_edge(u, v)
        if nx.check_planarity(g)[0]:
            extra -= 1
        else:
            g.remove_edge(u, v)
    return g


def main(path):
    rng = random.Random(20240611)
    out = ["# pinned k-apex corpus: 50 instances, <= 40 vertices, |X| <= 4"]
    for i in range(50):
        small = i < 20
        n = rng.randint(5, 9) if small else rng.randint(12, 36)
        k = rng.randint(1, 2) if small else rng.randint(1, min(4, 40 - n))
        h = planar_piece(rng, n, rng.randint(0, 3 if small else n // 2))
        edges = sorted(h.edges())
        apices = list(range(n, n + k))
        p = 0.35 if small else 0.12
        for x in apices:
            nb = [v for v in range(n) if rng.random() < p] or [rng.randrange(n)]
            edges += [(v, x) for v in nb]
        if k > 1 and rng.random() < 0.5:
            edges.append((apices[0], apices[1]))
        out.append(f"instance {i} apices {','.join(map(str, apices))}")
        out += [f"{u} {v}" for u, v in edges]
    open(path, "w").write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])

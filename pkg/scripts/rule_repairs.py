"""Girth of the printed edge-rule table and of every single-sign repair."""

from morsebranch.graph import LITERAL_RULES, build_gamma, girth, special_cycle


def cycles_ok(g):
    try:
        return all(len(special_cycle(g, s, t)) == 18 for s in (1, -1) for t in (1, -1))
    except Exception:
        return False


def main():
    print(f"printed rules: girth {girth(build_gamma(LITERAL_RULES))}")
    for key, offsets in LITERAL_RULES.items():
        for i in range(len(offsets)):
            flipped = tuple(-o if j == i else o for j, o in enumerate(offsets))
            if flipped == offsets:
                continue
            g = build_gamma({**LITERAL_RULES, key: flipped})
            print(f"{key[0].name}/{key[1].name} {offsets} -> {flipped}: girth {girth(g)}, "
                  f"special 18-cycles {'yes' if cycles_ok(g) else 'no'}")


if __name__ == "__main__":
    main()

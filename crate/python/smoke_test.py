"""Smoke test for the rlp extension module."""

import rlp


def main():
    square = rlp.Term("P(Q2,Q2)")
    verdict = rlp.test(square)
    assert verdict.accepted and verdict.reason is None
    assert verdict.feasible == (-2, 2)

    drawing = rlp.draw_term(square)
    assert sorted(drawing.coords) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert drawing.svg().count("<line") == 4

    triangle = rlp.Term("P(Q1,S(Q1,Q1))")
    rejected = rlp.test(triangle)
    assert not rejected.accepted
    assert rejected.reason.startswith("root condition")
    assert rlp.oracle(triangle) is False

    term = rlp.random_term(200, 7, min_chain=3)
    assert term.edge_count == 200
    assert rlp.Term.from_json(term.to_json()) == term
    assert rlp.test(term).accepted

    try:
        rlp.Term("P(Q1")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed term parsed")
    print("ok")


if __name__ == "__main__":
    main()

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ldq.algebra import Pattern
from ldq.errors import CriterionError, Unsupported
from ldq.generators import chain_web, number_web, star_web
from ldq.parser import parse_expression
from ldq.rdf import Triple, TriplePattern, Uri, Variable, ids_of
from ldq.reachability import (
    C_ALL,
    C_MATCH,
    C_NONE,
    INCOMPARABLE,
    Budget,
    ConstAnd,
    ConstOr,
    ConstT,
    ConstU,
    accepts,
    compute_reachable_part,
    criterion_eval,
    criterion_from_selector,
    less_restrictive_constant,
    load_triple_set,
    load_uri_set,
)
from ldq.web import all_data
from tests.strategies import (
    CRITERION_TRIPLES,
    CRITERION_URIS,
    FRESH_TRIPLE,
    FRESH_URI,
    constant_criteria,
    finite_webs,
    web_constant_criteria,
    web_queries,
    webs_with_seeds,
)

SUCC_QUERY = parse_expression("(?x <num:succ> ?y)")
CHAIN_QUERY = parse_expression("(?x <chain:next> ?y)")


def reachable_documents(web, seeds, criterion, expr):
    """Fixpoint over data links, independent of the frontier order"""
    docs = {web.dereference(s) for s in seeds} - {None}
    while True:
        found = {
            web.dereference(u)
            for doc_id in docs
            for t in web.data(doc_id)
            for u in ids_of(t)
            if criterion(t, u, expr)
        } - {None}
        if found <= docs:
            return docs
        docs |= found


def test_match_criterion_on_numbers():
    expr = parse_expression("(<num:1> <num:succ> ?v)")
    part = compute_reachable_part(number_web(), [Uri("num:1")], C_MATCH, expr)
    assert part.complete
    assert part.doc_ids == ["d1", "d2"]
    # num:succ is a broken link; num:2 yields d2, whose triple matches no pattern
    assert part.lookups_spent == 2
    assert part.seed_lookups == 1
    assert [lookup.uri for lookup in part.trace] == [Uri("num:1"), Uri("num:succ"), Uri("num:2")]
    assert part.trace[1].broken


@pytest.mark.parametrize("budget", [1, 5, 50])
def test_all_criterion_on_numbers_spends_the_budget(budget):
    part = compute_reachable_part(number_web(), [Uri("num:1")], C_ALL, SUCC_QUERY, Budget(budget))
    assert not part.complete
    assert len(part.documents) == budget
    assert part.lookups_spent == budget


def test_none_criterion_keeps_only_seed_documents():
    seeds = [Uri("num:3"), Uri("num:1"), Uri("num:succ")]
    part = compute_reachable_part(number_web(), seeds, C_NONE, SUCC_QUERY)
    assert part.complete
    assert part.doc_ids == ["d1", "d3"]
    assert part.lookups_spent == 0
    assert part.seed_lookups == 3


def test_star_completes_from_any_seed():
    part = compute_reachable_part(star_web(), [Uri("star:1")], C_ALL, Pattern(TriplePattern(Variable("x"), Uri("star:first"), Variable("y"))))
    assert part.complete
    assert part.doc_ids == ["d1"]


@pytest.mark.parametrize("k", [1, 5, 25])
def test_finite_chains_complete(k):
    part = compute_reachable_part(chain_web(k), [Uri("chain:1")], C_ALL, CHAIN_QUERY)
    assert part.complete
    assert len(part.documents) == k
    # one broken lookup of chain:next plus one per further document
    assert part.lookups_spent == (k if k > 1 else 0)


@pytest.mark.parametrize("budget", [10, 100, 1000])
def test_infinite_chain_exhausts_every_budget(budget):
    part = compute_reachable_part(chain_web(), [Uri("chain:1")], C_ALL, CHAIN_QUERY, Budget(budget))
    assert not part.complete
    assert part.lookups_spent == budget


def test_constant_criteria_follow_fixed_links():
    web = chain_web()
    seeds = [Uri("chain:1")]
    by_uri = compute_reachable_part(web, seeds, ConstU(frozenset({Uri("chain:2"), Uri("chain:9")})), CHAIN_QUERY)
    assert by_uri.doc_ids == ["d1", "d2"]
    link = Triple(Uri("chain:1"), Uri("chain:next"), Uri("chain:2"))
    by_triple = compute_reachable_part(web, seeds, ConstT(frozenset({link})), CHAIN_QUERY)
    assert by_triple.doc_ids == ["d1", "d2"]
    both = compute_reachable_part(web, seeds, ConstAnd(frozenset({Uri("chain:3")}), frozenset({link})), CHAIN_QUERY)
    assert both.doc_ids == ["d1"]


@pytest.mark.property_based
@given(
    u=st.frozensets(st.sampled_from([Uri(f"chain:{k}") for k in range(1, 13)] + [Uri("chain:next")]), max_size=5),
    t=st.frozensets(
        st.sampled_from([Triple(Uri(f"chain:{k}"), Uri("chain:next"), Uri(f"chain:{k + 1}")) for k in range(1, 11)]),
        max_size=5,
    ),
    seeds=st.frozensets(st.sampled_from([Uri(f"chain:{k}") for k in range(1, 6)]), min_size=1, max_size=2),
    kind=st.sampled_from([ConstU, ConstT, ConstAnd, ConstOr]),
    length=st.sampled_from([None, 1, 2, 5, 10]),
)
@settings(max_examples=200, deadline=None)
def test_constant_criteria_bound_the_reachable_part(u, t, seeds, kind, length):
    if kind is ConstU:
        criterion = ConstU(u)
    elif kind is ConstT:
        criterion = ConstT(t)
    else:
        criterion = kind(u, t)
    web = chain_web() if length is None else chain_web(length)
    part = compute_reachable_part(web, seeds, criterion, CHAIN_QUERY)
    assert part.complete
    assert len(part.documents) <= len(seeds) + len(u) + 3 * len(t)


def _accepted(criterion):
    universe = [(t, uri) for t in CRITERION_TRIPLES + [FRESH_TRIPLE] for uri in CRITERION_URIS + [FRESH_URI]]
    assert len(universe) == 50
    return frozenset(pair for pair in universe if accepts(criterion, *pair))


@pytest.mark.property_based
@given(c1=constant_criteria(), c2=constant_criteria())
@settings(max_examples=100, deadline=None)
def test_restrictiveness_agrees_with_exhaustive_check(c1, c2):
    a1, a2 = _accepted(c1), _accepted(c2)
    if a2 < a1:
        expected = True
    elif a1 < a2:
        expected = False
    else:
        expected = INCOMPARABLE
    assert less_restrictive_constant(c1, c2) == expected


def test_restrictiveness_facts():
    u = frozenset({Uri("ex:u")})
    t = frozenset({Triple(Uri("ex:s"), Uri("ex:p"), Uri("ex:o"))})
    assert less_restrictive_constant(ConstOr(u, t), ConstU(u)) is True
    assert less_restrictive_constant(ConstAnd(u, t), ConstT(t)) is False
    assert less_restrictive_constant(ConstU(u), ConstT(t)) is INCOMPARABLE
    assert less_restrictive_constant(ConstU(u), C_NONE) is True
    assert less_restrictive_constant(ConstU(u), ConstU(u)) is INCOMPARABLE
    assert less_restrictive_constant(ConstOr(u, t), ConstOr(u, t)) is INCOMPARABLE
    with pytest.raises(Unsupported):
        less_restrictive_constant(C_ALL, ConstU(u))


@pytest.mark.property_based
@given(instance=webs_with_seeds(), expr=web_queries(), criterion=st.sampled_from([C_ALL, C_NONE, C_MATCH]))
@settings(max_examples=200, deadline=None)
def test_frontier_reaches_exactly_the_link_closure(instance, expr, criterion):
    web, seeds = instance
    part = compute_reachable_part(web, seeds, criterion, expr)
    assert part.complete
    assert set(part.doc_ids) == reachable_documents(web, seeds, criterion, expr)
    if criterion is C_NONE:
        assert len(part.documents) <= len(seeds)


def test_selectors(fixtures_dir):
    assert criterion_from_selector("match") is C_MATCH
    c = criterion_from_selector(f"or:{fixtures_dir / 'follow_uris.txt'},{fixtures_dir / 'follow_triples.txt'}")
    assert c == ConstOr(
        frozenset({Uri("chain:2"), Uri("chain:3")}),
        frozenset({Triple(Uri("chain:1"), Uri("chain:next"), Uri("chain:2"))}),
    )
    with pytest.raises(CriterionError):
        criterion_from_selector("some")
    with pytest.raises(CriterionError):
        criterion_from_selector(f"and:{fixtures_dir / 'follow_uris.txt'}")


def test_budget():
    assert Budget().unlimited
    assert Budget(2).allows(1) and not Budget(2).allows(2)
    with pytest.raises(ValueError):
        Budget(0)


def test_criterion_eval_and_accepts():
    t = Triple(Uri("num:1"), Uri("num:succ"), Uri("num:2"))
    assert criterion_eval(C_MATCH, t, Uri("num:2"), parse_expression("(?x <num:succ> ?y)"))
    assert not criterion_eval(C_MATCH, t, Uri("num:2"), parse_expression("(?x <num:pred> ?y)"))
    assert accepts(ConstU(frozenset({Uri("num:2")})), t, Uri("num:2"))
    assert not accepts(C_NONE, t, Uri("num:2"))
    with pytest.raises(Unsupported):
        accepts(C_MATCH, t, Uri("num:2"))


def test_criterion_files_skip_comments_and_blank_lines(tmp_path):
    uris = tmp_path / "uris.txt"
    uris.write_text("# followed\n<chain:2>\n\n<chain:3>\n", encoding="utf-8")
    assert load_uri_set(uris) == {Uri("chain:2"), Uri("chain:3")}
    triples = tmp_path / "triples.txt"
    triples.write_text("<chain:1> <chain:next> <chain:2> .\n<chain:2> <chain:next> <chain:3>\n", encoding="utf-8")
    assert load_triple_set(triples) == {
        Triple(Uri("chain:1"), Uri("chain:next"), Uri("chain:2")),
        Triple(Uri("chain:2"), Uri("chain:next"), Uri("chain:3")),
    }
    bad = tmp_path / "bad.txt"
    bad.write_text('"literal"\n', encoding="utf-8")
    with pytest.raises(CriterionError):
        load_uri_set(bad)


def _subsets(items, max_size):
    return [frozenset(c) for k in range(max_size + 1) for c in itertools.combinations(items, k)]


@pytest.mark.parametrize("length", range(1, 11))
def test_constant_criteria_bound_holds_exhaustively_on_short_chains(length):
    web = chain_web(length)
    uris = [Uri(f"chain:{k}") for k in range(1, length + 2)] + [Uri("chain:next")]
    links = [Triple(Uri(f"chain:{k}"), Uri("chain:next"), Uri(f"chain:{k + 1}")) for k in range(1, length)]
    seeds = [Uri("chain:1")]
    criteria = [ConstU(u) for u in _subsets(uris, 2)]
    criteria += [ConstT(t) for t in _subsets(links, 2)]
    criteria += [kind(u, t) for kind in (ConstAnd, ConstOr) for u in _subsets(uris, 1) for t in _subsets(links, 1)]
    for criterion in criteria:
        part = compute_reachable_part(web, seeds, criterion, CHAIN_QUERY)
        u = getattr(criterion, "uris", frozenset())
        t = getattr(criterion, "triples", frozenset())
        assert part.complete
        assert len(part.documents) <= len(seeds) + len(u) + 3 * len(t)


def _documents(part):
    return set(part.doc_ids)


@pytest.mark.property_based
@given(data=st.data(), web=finite_webs())
@settings(max_examples=300, deadline=None)
def test_less_restrictive_criteria_reach_at_least_as_much(data, web):
    c1 = data.draw(web_constant_criteria(web))
    c2 = data.draw(web_constant_criteria(web))
    seeds = data.draw(st.frozensets(st.sampled_from(sorted(web.adoc, key=lambda u: u.sort_key)), min_size=1, max_size=2))
    comparison = less_restrictive_constant(c1, c2)
    if comparison is INCOMPARABLE:
        return
    wide, narrow = (c1, c2) if comparison else (c2, c1)
    wide_part = compute_reachable_part(web, seeds, wide, CHAIN_QUERY)
    narrow_part = compute_reachable_part(web, seeds, narrow, CHAIN_QUERY)
    assert _documents(narrow_part) <= _documents(wide_part)
    assert narrow_part.lookups_spent <= wide_part.lookups_spent


@pytest.mark.property_based
@given(data=st.data(), web=finite_webs())
@settings(max_examples=300, deadline=None)
def test_narrowed_criteria_never_reach_more(data, web):
    uris = sorted(web.adoc, key=lambda u: u.sort_key)
    triples = sorted(all_data(web), key=lambda t: t.sort_key)
    u = data.draw(st.frozensets(st.sampled_from(uris), max_size=4))
    t = data.draw(st.frozensets(st.sampled_from(triples), max_size=4)) if triples else frozenset()
    u_sub = data.draw(st.sampled_from(_subsets(sorted(u, key=lambda x: x.sort_key), len(u))))
    t_sub = data.draw(st.sampled_from(_subsets(sorted(t, key=lambda x: x.sort_key), len(t))))
    narrow = data.draw(st.sampled_from([ConstU(u_sub), ConstT(t_sub), ConstAnd(u_sub, t_sub), ConstOr(u_sub, t_sub)]))
    wide = ConstOr(u, t)
    assert less_restrictive_constant(narrow, wide) is not True
    seeds = data.draw(st.frozensets(st.sampled_from(uris), min_size=1, max_size=2))
    wide_part = compute_reachable_part(web, seeds, wide, CHAIN_QUERY)
    narrow_part = compute_reachable_part(web, seeds, narrow, CHAIN_QUERY)
    assert _documents(narrow_part) <= _documents(wide_part)
    assert narrow_part.lookups_spent <= wide_part.lookups_spent


@pytest.mark.property_based
@given(
    data=st.data(),
    generator=st.sampled_from(["chain", "numbers"]),
)
@settings(max_examples=200, deadline=None)
def test_more_restrictive_criteria_complete_with_no_more_lookups(data, generator):
    if generator == "chain":
        web = chain_web()
        uris = [Uri(f"chain:{k}") for k in range(1, 13)] + [Uri("chain:next")]
        triples = [Triple(Uri(f"chain:{k}"), Uri("chain:next"), Uri(f"chain:{k + 1}")) for k in range(1, 12)]
        query = CHAIN_QUERY
    else:
        web = number_web()
        uris = [Uri(f"num:{k}") for k in range(1, 13)] + [Uri("num:succ")]
        triples = [Triple(Uri(f"num:{k}"), Uri("num:succ"), Uri(f"num:{k + 1}")) for k in range(1, 12)]
        query = SUCC_QUERY
    c1 = data.draw(constant_criteria(uris=uris, triples=triples))
    c2 = data.draw(constant_criteria(uris=uris, triples=triples))
    if less_restrictive_constant(c1, c2) is not True:
        return
    seeds = [uris[0]]
    budget = Budget(500)
    wide = compute_reachable_part(web, seeds, c1, query, budget)
    narrow = compute_reachable_part(web, seeds, c2, query, budget)
    if wide.complete:
        assert narrow.complete
        assert narrow.lookups_spent <= wide.lookups_spent
        assert _documents(narrow) <= _documents(wide)

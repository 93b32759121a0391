"""Postcondition checkers for the refinement passes, shared by unit and
acceptance tests.  Each checker raises AssertionError naming the condition."""

from collections import Counter


def member_multiset(pairs):
    counts = Counter()
    for p in pairs:
        counts.update(p.members)
    return counts


def check_merge_postconditions(input_pairs, loss, complete, gt):
    # Union of output members equals union of input members, exactly.
    assert member_multiset(loss) + member_multiset(complete) == member_multiset(
        input_pairs
    ), "member multiset not preserved"

    # Loss set is exactly the message-loss input pairs, unchanged.
    expected_loss = sorted(
        (frozenset(p.members), p.template)
        for p in input_pairs
        if gt.matched_template(p.template) is None
    )
    actual_loss = sorted((frozenset(p.members), p.template) for p in loss)
    assert actual_loss == expected_loss, "loss set differs from message-loss inputs"

    # No message-loss template in the complete set.
    for p in complete:
        assert gt.matched_template(p.template) is not None, (
            "complete set holds a message-loss template"
        )

    # No mixed cluster in the complete set.
    for p in complete:
        owners = {gt.cluster_of[n] for n in p.members}
        assert len(owners) == 1, "complete set holds a mixed cluster"

    # No two complete templates embed the same ground-truth template.
    matched = [gt.matched_template(p.template) for p in complete]
    assert len(matched) == len(set(matched)), (
        "two complete templates are message-equal"
    )


def check_separation_postconditions(members, out, gt):
    # Output members partition the input cluster.
    assert member_multiset(out) == Counter(members), "members not partitioned"

    # Every output template is message-complete.
    for p in out:
        assert gt.matched_template(p.template) is not None, (
            "separated pair has message loss"
        )

    # Every output cluster is pure.
    for p in out:
        owners = {gt.cluster_of[n] for n in p.members}
        assert len(owners) == 1, "separated pair is mixed"

    # No two output templates are message-equal.
    matched = [gt.matched_template(p.template) for p in out]
    assert len(matched) == len(set(matched)), "two separated templates message-equal"

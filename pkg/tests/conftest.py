"""Prints a one-line verdict per acceptance criterion after the test run."""

CRITERIA = {
    "test_a1_backward_proof_shows_exact_state_sequence": (
        "A1",
        "the guided proof renders the exact goal-state sequence",
    ),
    "test_a2_one_script_proves_plain_annotated_and_existential_goals": (
        "A2",
        "one tactic script closes the plain, annotated and existential goals",
    ),
    "test_a3_synthesized_function_prints_exactly": (
        "A3",
        "the synthesized swap function prints exactly",
    ),
    "test_a4_matcher_agrees_with_brute_force_on_random_cases": (
        "A4",
        "context matching agrees with brute force on 1000 random cases in <10s",
    ),
    "test_a5_replay_accepts_honest_proofs_and_rejects_tampered_ones": (
        "A5",
        "replay accepts 100 honest proofs and rejects 100 tampered ones",
    ),
    "test_a6_bounded_search_proves_and_refuses_within_budget": (
        "A6",
        "depth-8 search proves the linear goals and refuses duplication in <5s",
    ),
    "test_a7_printing_then_parsing_is_identity_on_random_terms": (
        "A7",
        "parse after print is the identity on 500 random terms per logic",
    ),
    "test_a8_no_displayed_context_mixes_empty_with_elements": (
        "A8",
        "no rendered context shows the empty context inside a join",
    ),
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    verdicts = {}
    for status, ok in (("passed", True), ("failed", False), ("error", False)):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            name = nodeid.rsplit("::", 1)[-1].split("[")[0]
            if name in CRITERIA:
                cid, _ = CRITERIA[name]
                verdicts[cid] = verdicts.get(cid, True) and ok
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, (cid, desc) in sorted(CRITERIA.items(), key=lambda kv: kv[1][0]):
        if cid in verdicts:
            word = "pass" if verdicts[cid] else "FAIL"
            terminalreporter.write_line(f"{cid} {word}: {desc}")

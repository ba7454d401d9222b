from fastapi.testclient import TestClient

from cyclekit.graphs import (
    complete_graph,
    greedy_proper_colouring,
    serialize_coloured_graph,
    serialize_graph,
    random_graph,
)
from cyclekit.service.app import app

client = TestClient(app)


def coloured_doc(n=8, seed=0):
    g = complete_graph(n)
    return serialize_coloured_graph(g, greedy_proper_colouring(g, seed))


class TestMetaEndpoints:
    def test_health(self):
        assert client.get("/api/health").json() == {"status": "ok"}

    def test_version(self):
        body = client.get("/api/version").json()
        assert body["tool"] == "cyclekit" and body["version"]


class TestGen:
    def test_hypercube(self):
        body = client.post(
            "/api/gen", json={"kind": "hypercube", "m": 4, "no_timestamp": True}
        ).json()
        assert body["stats"] == {"n": 16, "edges": 32, "colours": 4}
        edge_lines = [
            line
            for line in body["document"].splitlines()
            if line and not line.startswith("#") and len(line.split()) == 3
        ]
        assert len(edge_lines) == 32

    def test_random_missing_p_is_400(self):
        reply = client.post("/api/gen", json={"kind": "random", "n": 10})
        assert reply.status_code == 400
        assert "--p" in reply.json()["detail"]

    def test_subset_aux(self):
        doc = serialize_graph(complete_graph(4))
        body = client.post(
            "/api/gen", json={"kind": "subset-aux", "document": doc, "r": 2}
        ).json()
        assert body["stats"]["n"] == 6 and body["stats"]["edges"] == 3

    def test_deterministic_with_no_timestamp(self):
        req = {"kind": "random", "n": 30, "p": 0.4, "seed": 11, "no_timestamp": True}
        a = client.post("/api/gen", json=req).json()
        b = client.post("/api/gen", json=req).json()
        assert a == b

    def test_timestamp_present_by_default(self):
        body = client.post("/api/gen", json={"kind": "random", "n": 5, "p": 0.5}).json()
        assert body["meta"]["timestamp"]


class TestVerify:
    def test_ratio_pass(self):
        doc = serialize_graph(random_graph(10, 0.5, 1))
        body = client.post(
            "/api/verify", json={"check": "ratio", "document": doc, "kmax": 3}
        ).json()
        assert body["passed"] is True

    def test_proper_on_coloured(self):
        body = client.post(
            "/api/verify", json={"check": "proper", "document": coloured_doc()}
        ).json()
        assert body["passed"] is True

    def test_key_lemma_same_colour(self):
        body = client.post(
            "/api/verify",
            json={
                "check": "key-lemma",
                "document": coloured_doc(7),
                "relation": "same-colour",
                "k": 2,
            },
        ).json()
        assert body["passed"] is True
        assert body["details"]["count"] <= body["details"]["bound"]

    def test_bad_document_is_400(self):
        reply = client.post(
            "/api/verify", json={"check": "ratio", "document": "2\n0 0\n"}
        )
        assert reply.status_code == 400
        assert "self-loop" in reply.json()["detail"]

    def test_sparsity_needs_colours(self):
        doc = serialize_graph(random_graph(6, 0.5, 0))
        reply = client.post(
            "/api/verify",
            json={"check": "sparsity", "document": doc, "relation": "same-colour"},
        )
        assert reply.status_code == 400


class TestVerifyAllChecks:
    def test_every_check_is_wired(self):
        from cyclekit.graphs import Graph

        dense = serialize_graph(random_graph(150, 0.55, 3))
        small = serialize_graph(random_graph(9, 0.6, 5))
        bip = serialize_graph(
            Graph(8, [(i, 4 + j) for i in range(4) for j in range(4)])
        )
        coloured = coloured_doc(7, seed=1)
        cases = {
            "proper": (coloured, {}),
            "ratio": (small, {"kmax": 3}),
            "interpolation": (small, {"k": 3, "ell": 1}),
            "sidorenko": (small, {"k": 2}),
            "bipartite-mindeg": (bip, {"k": 2}),
            "sparsity": (coloured, {"relation": "same-colour"}),
            "key-lemma": (coloured, {"relation": "same-colour", "k": 2}),
            "dyadic": (small, {"k": 2}),
            "tuple-bound": (coloured, {"r": 2}),
            "subset-bound": (small, {"r": 2}),
            "krr-count": (small, {"r": 2}),
            "mono-matchings": (coloured, {"r": 2}),
            "step1": (dense, {}),
            "step2": (dense, {}),
            "almost-regular": (dense, {"eps": 0.5, "c": 1.0}),
            "blowup-biregular": (dense, {"r": 1}),
        }
        for check, (doc, params) in cases.items():
            reply = client.post(
                "/api/verify",
                json={"check": check, "document": doc, **params},
            )
            assert reply.status_code == 200, (check, reply.text)
            body = reply.json()
            assert body["passed"] is True, (check, body["details"])
            assert body["meta"]["command"] == f"verify {check}"


class TestSearch:
    def test_rainbow_cycle_found_on_k12(self):
        body = client.post(
            "/api/search",
            json={
                "finder": "rainbow-cycle",
                "document": coloured_doc(12),
                "k": 2,
                "seed": 1,
                "no_timestamp": True,
            },
        ).json()
        assert body["status"] == "found"
        assert body["witness"]["type"] == "cycle"
        assert len(body["witness"]["vertices"]) == 4

    def test_hypercube_absent(self):
        gen = client.post(
            "/api/gen", json={"kind": "hypercube", "m": 4, "no_timestamp": True}
        ).json()
        body = client.post(
            "/api/search",
            json={
                "finder": "rainbow-cycle",
                "document": gen["document"],
                "k": 2,
                "budget": 500,
            },
        ).json()
        assert body["status"] == "certified-absent"

    def test_search_reports_are_reproducible(self):
        req = {
            "finder": "rainbow-cycle",
            "document": coloured_doc(10),
            "k": 2,
            "seed": 3,
            "no_timestamp": True,
        }
        a = client.post("/api/search", json=req).json()
        b = client.post("/api/search", json=req).json()
        assert a == b


class TestSweep:
    def test_small_sweep_passes(self):
        body = client.post(
            "/api/sweep",
            json={"family": "keylemma", "nmax": 5, "ks": [2], "no_timestamp": True},
        ).json()
        assert body["all_passed"] is True
        assert body["columns"][0] == "instance-id"
        ids = [row[0] for row in body["rows"]]
        assert ids == sorted(ids)
        # (1 equality + 3 colourings) per connected graph with n <= 5: 31 graphs
        assert len(body["rows"]) == 31 * 4

    def test_nmax_guard(self):
        reply = client.post("/api/sweep", json={"family": "keylemma", "nmax": 12})
        assert reply.status_code == 400

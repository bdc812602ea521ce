import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from badgekit.errors import ConfigurationError
from badgekit.metrics import TimeWindow
from badgekit.proximity import (
    PathLossParams,
    ProximityObservation,
    build_graph,
    estimate_distance,
    filter_to_group,
)
from badgekit.simulator import rssi_from_distance


class FakeRegistry:
    def __init__(self, mapping):
        self.mapping = mapping

    def group_of(self, device_id):
        return self.mapping.get(device_id)


def obs(scanner, beacon, rssi, ts=0):
    return ProximityObservation(scanner, beacon, rssi, ts)


class TestEstimateDistance:
    def test_reference_distance(self):
        params = PathLossParams(rssi_at_1m=-59, exponent=2.0)
        assert estimate_distance(-59, params) == pytest.approx(1.0, abs=1e-12)

    def test_ten_meter_anchor(self):
        params = PathLossParams(rssi_at_1m=-59, exponent=2.0)
        assert estimate_distance(-79, params) == pytest.approx(10.0, abs=1e-9)

    @given(
        rssi=st.integers(-119, -1),
        params=st.builds(
            PathLossParams,
            rssi_at_1m=st.floats(-90, -30),
            exponent=st.floats(1.0, 6.0),
        ),
    )
    def test_strictly_decreasing_in_rssi(self, rssi, params):
        assert estimate_distance(rssi, params) < estimate_distance(rssi - 1, params)

    @given(
        d=st.floats(0.01, 100.0),
        params=st.builds(
            PathLossParams,
            rssi_at_1m=st.floats(-90, -30),
            exponent=st.floats(1.0, 6.0),
        ),
    )
    @settings(max_examples=150)
    def test_round_trip_with_forward_model(self, d, params):
        rssi = rssi_from_distance(d, params, noise_db=0.0)
        assert estimate_distance(rssi, params) == pytest.approx(d, rel=1e-9)

    def test_invalid_params(self):
        with pytest.raises(ConfigurationError):
            PathLossParams(exponent=0.5)
        with pytest.raises(ConfigurationError):
            PathLossParams(rssi_at_1m=-10)


class TestFilterToGroup:
    def test_empty_registry(self):
        observations = [obs("a", "b", -60)]
        assert filter_to_group(observations, FakeRegistry({})) == []

    def test_mixed_group_fixture(self):
        reg = FakeRegistry({"a": "g1", "b": "g1", "c": "g2", "d": "g2"})
        mixed = [
            obs("a", "b", -60),
            obs("b", "a", -61),
            obs("c", "d", -62),
            obs("d", "c", -63),
            obs("a", "c", -64),  # cross-group
            obs("b", "x", -65),  # unknown beacon
        ]
        kept = filter_to_group(mixed, reg)
        assert len(kept) == 4
        assert all(reg.group_of(o.scanner_id) == reg.group_of(o.beacon_id) for o in kept)

    @given(data=st.data())
    @settings(max_examples=60)
    def test_matches_predicate_oracle(self, data):
        ids = ["a", "b", "c", "d", "e"]
        mapping = {
            i: data.draw(st.sampled_from(["g1", "g2", None]), label=i) for i in ids
        }
        mapping = {k: v for k, v in mapping.items() if v}
        reg = FakeRegistry(mapping)
        n = data.draw(st.integers(0, 15))
        observations = []
        for _ in range(n):
            s, b = data.draw(
                st.tuples(st.sampled_from(ids), st.sampled_from(ids)).filter(
                    lambda t: t[0] != t[1]
                )
            )
            observations.append(obs(s, b, data.draw(st.integers(-90, -40))))
        expected = [
            o
            for o in observations
            if o.scanner_id in mapping
            and o.beacon_id in mapping
            and mapping[o.scanner_id] == mapping[o.beacon_id]
        ]
        assert filter_to_group(observations, reg) == expected


class TestBuildGraph:
    WINDOW = TimeWindow(0, 10_000)

    def test_empty(self):
        graph = build_graph([], self.WINDOW)
        assert graph.nodes == ()
        assert graph.edges == ()

    def test_median_of_three(self):
        observations = [
            obs("a", "b", -60, 100),
            obs("a", "b", -70, 200),
            obs("a", "b", -80, 300),
        ]
        graph = build_graph(observations, self.WINDOW, min_obs=2)
        assert len(graph.edges) == 1
        assert graph.edges[0].median_rssi == -70.0

    def test_direction_pooling(self):
        observations = [
            obs("a", "b", -60, 100),
            obs("a", "b", -62, 200),
            obs("b", "a", -64, 300),
        ]
        graph = build_graph(observations, self.WINDOW, min_obs=3)
        assert len(graph.edges) == 1
        assert graph.edges[0].median_rssi == -62.0

    def test_min_obs_filters_sparse_pairs(self):
        graph = build_graph([obs("a", "b", -60, 100)], self.WINDOW, min_obs=2)
        assert graph.edges == ()
        assert set(graph.nodes) == {"a", "b"}

    def test_window_is_half_open(self):
        observations = [obs("a", "b", -60, 0), obs("a", "b", -70, 10_000)]
        graph = build_graph(observations, self.WINDOW, min_obs=1)
        assert graph.edges[0].median_rssi == -60.0

    @given(data=st.data())
    @settings(max_examples=50)
    def test_order_and_direction_invariance(self, data):
        base = [
            obs("a", "b", data.draw(st.integers(-90, -40)), ts)
            for ts in range(0, 500, 100)
        ]
        flipped = [
            ProximityObservation(o.beacon_id, o.scanner_id, o.rssi_dbm, o.ts)
            for o in base
        ]
        shuffled = data.draw(st.permutations(base))
        g1 = build_graph(base, self.WINDOW, min_obs=1)
        g2 = build_graph(flipped, self.WINDOW, min_obs=1)
        g3 = build_graph(shuffled, self.WINDOW, min_obs=1)
        assert g1 == g2 == g3

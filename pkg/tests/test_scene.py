import pytest
from fractions import Fraction

from l1paths.geometry import INFINITE, Polygon
from l1paths.scene import (
    DISJOINTNESS_VIOLATION,
    GENERAL_POSITION_VIOLATION,
    INFEASIBLE_PARAMETERS,
    MALFORMED_POLYGON,
    NEGATIVE_WEIGHT,
    NON_RECTILINEAR_EDGE,
    PARSE_ERROR,
    POLYGONAL,
    RECTILINEAR_WEIGHTED,
    SCENE_A,
    SCENE_W,
    Scene,
    SceneError,
    generate_scene,
    load_scene,
    save_scene,
    validate_scene,
)


def test_validate_scene_a_stats():
    stats = validate_scene(SCENE_A)
    assert (stats.n, stats.h, stats.levels, stats.super_levels) == (4, 1, 2, 2)


def test_validate_scene_w_stats():
    stats = validate_scene(SCENE_W)
    assert (stats.n, stats.h) == (4, 1)


def test_general_position_duplicate_x():
    scene = Scene(
        obstacles=(Polygon([(2, 1), (5, 2), (4, 6), (2, 5)]),),
        bbox=(-1, -1, 7, 7),
        mode=POLYGONAL,
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == GENERAL_POSITION_VIOLATION


def test_rectangle_rejected_in_polygonal_mode():
    scene = Scene(obstacles=SCENE_W.obstacles, bbox=SCENE_W.bbox, mode=POLYGONAL)
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == GENERAL_POSITION_VIOLATION


def test_disjointness_violation():
    scene = Scene(
        obstacles=(
            Polygon([(0, 0), (4, 1), (3, 5)]),
            Polygon([(2, 2), (8, 3), (7, 7)]),
        ),
        bbox=(-10, -10, 20, 20),
        mode=POLYGONAL,
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == DISJOINTNESS_VIOLATION


def test_nested_obstacles_are_disjointness_violation():
    scene = Scene(
        obstacles=(
            Polygon([(0, 0), (20, 1), (19, 20), (1, 19)]),
            Polygon([(8, 8), (12, 9), (11, 12)]),
        ),
        bbox=(-5, -5, 25, 25),
        mode=POLYGONAL,
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == DISJOINTNESS_VIOLATION


def test_clockwise_polygon_rejected():
    scene = Scene(
        obstacles=(Polygon([(1, 5), (4, 6), (5, 2), (2, 1)]),),
        bbox=(-1, -1, 7, 7),
        mode=POLYGONAL,
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == MALFORMED_POLYGON


def test_weighted_mode_rejects_sloped_edge():
    scene = Scene(
        obstacles=(Polygon([(0, 0), (4, 1), (3, 5)]),),
        bbox=(-2, -2, 8, 8),
        mode=RECTILINEAR_WEIGHTED,
        weights=(1,),
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == NON_RECTILINEAR_EDGE


def test_weighted_mode_rejects_negative_weight():
    scene = Scene(
        obstacles=SCENE_W.obstacles,
        bbox=SCENE_W.bbox,
        mode=RECTILINEAR_WEIGHTED,
        weights=(Fraction(-1, 2),),
    )
    with pytest.raises(SceneError) as err:
        validate_scene(scene)
    assert err.value.code == NEGATIVE_WEIGHT


def test_generate_polygonal_deterministic_and_valid():
    s1 = generate_scene(12, 3, POLYGONAL, seed=7)
    s2 = generate_scene(12, 3, POLYGONAL, seed=7)
    assert save_scene(s1) == save_scene(s2)
    stats = validate_scene(s1)
    assert stats.n == 12 and stats.h == 3


def test_generate_infeasible():
    with pytest.raises(SceneError) as err:
        generate_scene(2, 1, POLYGONAL, seed=1)
    assert err.value.code == INFEASIBLE_PARAMETERS


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("mode", [POLYGONAL, RECTILINEAR_WEIGHTED])
def test_generate_validates_across_seeds(mode, seed):
    n, h = 18 + seed, 2 + (seed % 3)
    scene = generate_scene(n, h, mode, seed=seed)
    stats = validate_scene(scene)
    assert stats.h == h
    if mode == POLYGONAL:
        assert stats.n == n
    else:
        assert n - 1 <= stats.n <= n
        assert scene.weights is not None


def test_weighted_generation_can_include_infinite():
    scene = generate_scene(24, 3, RECTILINEAR_WEIGHTED, seed=3,
                           weight_palette=(INFINITE,))
    assert all(w == INFINITE for w in scene.weights)


def test_save_load_round_trip():
    data = save_scene(SCENE_A)
    scene = load_scene(data)
    assert scene == SCENE_A
    # canonical serialization is a fixed point
    assert save_scene(scene) == data
    wdata = save_scene(SCENE_W)
    wscene = load_scene(wdata)
    assert wscene == SCENE_W
    assert save_scene(wscene) == wdata


def test_load_truncated_document():
    with pytest.raises(SceneError) as err:
        load_scene(save_scene(SCENE_A)[:25])
    assert err.value.code == PARSE_ERROR


def test_load_clockwise_polygon():
    import json

    doc = json.loads(save_scene(SCENE_A))
    doc["obstacles"][0]["vertices"].reverse()
    with pytest.raises(SceneError) as err:
        load_scene(json.dumps(doc).encode())
    assert err.value.code == MALFORMED_POLYGON

"""MLP configuration, forward/backward passes, training loop, and checkpoints."""

import math

import numpy as np
import pytest

from cogmap.dataset import EmbeddingTable, ExampleSet
from cogmap.errors import InputError, TrainingError
from cogmap.neural import (MlpConfig, MlpModel, forward, gradient_check,
                           init_model, load_model, loss, loss_gradients,
                           predict_all, save_model, train)


def small_config(**overrides):
    base = dict(input_dim=4, output_dim=3, hidden_dim=5, dropout_rate=0.0,
                learning_rate=0.05, epochs=5, batch_size=2, momentum=0.9, seed=1)
    base.update(overrides)
    return MlpConfig(**base)


def zero_model(config):
    return MlpModel(w1=np.zeros((config.hidden_dim, config.input_dim)),
                    b1=np.zeros(config.hidden_dim),
                    w2=np.zeros((config.output_dim, config.hidden_dim)),
                    b2=np.zeros(config.output_dim), config=config)


def toy_examples(n_per=3, seed=0):
    """Two separable 2-D clusters whose targets are distinct distributions."""
    rng = np.random.default_rng(seed)
    inputs, targets, labels, words = [], [], [], []
    for c, (center, dist) in enumerate([((4.0, 0.0), (0.9, 0.1)),
                                        ((0.0, 4.0), (0.1, 0.9))]):
        for i in range(n_per):
            inputs.append(np.array(center) + 0.1 * rng.standard_normal(2))
            targets.append(np.array(dist))
            labels.append(f"c{c}")
            words.append(f"w{c}{i}")
    return ExampleSet(inputs=np.array(inputs), targets=np.array(targets),
                      labels=labels, words=words)


# ------------------------------------------------------------------ config

def test_config_validation():
    with pytest.raises(InputError):
        small_config(input_dim=0)
    with pytest.raises(InputError):
        small_config(hidden_dim=-1)
    with pytest.raises(InputError):
        small_config(dropout_rate=1.0)
    with pytest.raises(InputError):
        small_config(dropout_rate=-0.1)
    with pytest.raises(InputError):
        small_config(learning_rate=-1e-9)
    with pytest.raises(InputError):
        small_config(epochs=0)
    with pytest.raises(InputError):
        small_config(batch_size=0)
    with pytest.raises(InputError):
        small_config(momentum=1.0)
    # boundary values that must be accepted
    small_config(dropout_rate=0.0, learning_rate=0.0, momentum=0.0)


def test_init_is_seeded_glorot():
    cfg = small_config(seed=42)
    a = init_model(cfg)
    b = init_model(cfg)
    np.testing.assert_array_equal(a.w1, b.w1)
    np.testing.assert_array_equal(a.w2, b.w2)
    np.testing.assert_array_equal(a.b1, np.zeros(cfg.hidden_dim))
    np.testing.assert_array_equal(a.b2, np.zeros(cfg.output_dim))
    lim1 = math.sqrt(6.0 / (cfg.input_dim + cfg.hidden_dim))
    lim2 = math.sqrt(6.0 / (cfg.hidden_dim + cfg.output_dim))
    assert np.all(np.abs(a.w1) <= lim1) and np.all(np.abs(a.w2) <= lim2)
    c = init_model(small_config(seed=43))
    assert not np.array_equal(a.w1, c.w1)


# ----------------------------------------------------------------- forward

def test_zero_model_predicts_uniform():
    cfg = small_config()
    p = forward(zero_model(cfg), np.ones(cfg.input_dim))
    np.testing.assert_allclose(p, np.full(cfg.output_dim, 1.0 / cfg.output_dim),
                               atol=1e-15)


def test_all_ones_mask_matches_scaled_input():
    # inverted dropout with a full mask multiplies the input by 1/(1-rate);
    # at rate .8 the float divisor is 0.19999999999999996, so comparison
    # against the notional 5x input agrees to rounding, not bitwise
    cfg = small_config(dropout_rate=0.8, seed=3)
    model = init_model(cfg)
    x = np.random.default_rng(5).standard_normal(cfg.input_dim)
    masked = forward(model, x, mode="train-with-mask", mask=np.ones(cfg.input_dim))
    np.testing.assert_allclose(masked, forward(model, 5.0 * x), rtol=1e-12)


def test_zero_mask_drops_everything():
    cfg = small_config(dropout_rate=0.5, seed=3)
    model = init_model(cfg)
    x = np.full(cfg.input_dim, 2.0)
    dropped = forward(model, x, mode="train", mask=np.zeros(cfg.input_dim))
    np.testing.assert_array_equal(dropped, forward(model, np.zeros(cfg.input_dim)))


def test_forward_input_validation():
    cfg = small_config()
    model = init_model(cfg)
    with pytest.raises(InputError, match="expected 4"):
        forward(model, np.ones(7))
    with pytest.raises(InputError, match="mask"):
        forward(model, np.ones(4), mode="train")
    with pytest.raises(InputError, match="mode"):
        forward(model, np.ones(4), mode="evaluate")


# -------------------------------------------------------------------- loss

def test_loss_against_uniform_prediction():
    p = np.full(60, 1.0 / 60.0)
    t = np.zeros(60)
    t[7] = 1.0
    assert loss(p, t) == pytest.approx(math.log(60.0), abs=1e-12)


def test_loss_half_mass():
    assert loss(np.array([0.5, 0.5]), np.array([1.0, 0.0])) == \
        pytest.approx(math.log(2.0), abs=1e-15)


def test_loss_clamps_zero_predictions():
    val = loss(np.array([0.0, 1.0]), np.array([1.0, 0.0]))
    assert val == pytest.approx(-math.log(1e-12), abs=1e-9)
    assert math.isfinite(val)


# --------------------------------------------------------------- gradients

def test_zero_model_output_gradient_is_prediction_minus_target():
    cfg = small_config()
    model = zero_model(cfg)
    target = np.array([1.0, 0.0, 0.0])
    grads = loss_gradients(model, np.ones(cfg.input_dim), target)
    uniform = np.full(cfg.output_dim, 1.0 / cfg.output_dim)
    np.testing.assert_allclose(grads["b2"], uniform - target, atol=1e-15)
    # hidden activations are zero, so every upstream gradient vanishes
    np.testing.assert_array_equal(grads["w2"], 0.0)
    np.testing.assert_array_equal(grads["w1"], 0.0)
    np.testing.assert_array_equal(grads["b1"], 0.0)


def test_gradient_zero_when_target_equals_prediction():
    cfg = small_config(seed=8)
    model = init_model(cfg)
    x = np.random.default_rng(2).standard_normal(cfg.input_dim)
    target = forward(model, x)
    grads = loss_gradients(model, x, target)
    for g in grads.values():
        assert np.linalg.norm(g) < 1e-9


def test_gradient_check_small_network():
    cfg = MlpConfig(input_dim=4, output_dim=3, hidden_dim=3, dropout_rate=0.0,
                    learning_rate=0.01, epochs=1, batch_size=1, momentum=0.0, seed=1)
    rng = np.random.default_rng(1)
    x = rng.standard_normal(4)
    t = rng.random(3)
    t /= t.sum()
    assert gradient_check(cfg, (x, t)) < 1e-4


# ---------------------------------------------------------------- training

def test_zero_lr_single_epoch_preserves_init_bitwise():
    ex = toy_examples()
    cfg = MlpConfig(input_dim=2, output_dim=2, hidden_dim=4, dropout_rate=0.5,
                    learning_rate=0.0, epochs=1, batch_size=2, momentum=0.9, seed=17)
    model, report = train(cfg, ex)
    ref = init_model(cfg)
    np.testing.assert_array_equal(model.w1, ref.w1)
    np.testing.assert_array_equal(model.b1, ref.b1)
    np.testing.assert_array_equal(model.w2, ref.w2)
    np.testing.assert_array_equal(model.b2, ref.b2)
    assert len(report.loss_per_epoch) == 1
    assert report.final_train_loss == report.loss_per_epoch[-1]


def test_training_is_deterministic_bitwise():
    ex = toy_examples()
    cfg = MlpConfig(input_dim=2, output_dim=2, hidden_dim=6, dropout_rate=0.3,
                    learning_rate=0.01, epochs=20, batch_size=2, momentum=0.9, seed=5)
    m1, r1 = train(cfg, ex)
    m2, r2 = train(cfg, ex)
    np.testing.assert_array_equal(m1.w1, m2.w1)
    np.testing.assert_array_equal(m1.w2, m2.w2)
    assert r1.loss_per_epoch == r2.loss_per_epoch


def test_training_reduces_loss_on_separable_toy():
    ex = toy_examples()
    cfg = MlpConfig(input_dim=2, output_dim=2, hidden_dim=8, dropout_rate=0.0,
                    learning_rate=0.05, epochs=200, batch_size=3, momentum=0.9, seed=2)
    _, report = train(cfg, ex)
    assert report.final_train_loss < report.loss_per_epoch[0]
    assert len(report.loss_per_epoch) == 200


def test_training_aborts_on_divergence():
    # +x and -x share every batch, so however the exploding updates sign the
    # weights some hidden unit stays active and the magnitudes keep compounding
    # until the loss (or a parameter) goes non-finite
    ex = ExampleSet(inputs=np.array([[3.0, 1.0], [-3.0, -1.0]]),
                    targets=np.array([[0.8, 0.2], [0.2, 0.8]]),
                    labels=["a", "b"], words=["wa", "wb"])
    cfg = MlpConfig(input_dim=2, output_dim=2, hidden_dim=4, dropout_rate=0.0,
                    learning_rate=1e30, epochs=60, batch_size=2, momentum=0.0, seed=1)
    with np.errstate(over="ignore", invalid="ignore"), \
            pytest.raises(TrainingError, match="non-finite"):
        train(cfg, ex)


def test_train_validates_example_shapes():
    ex = toy_examples()
    with pytest.raises(InputError, match="input dim"):
        train(small_config(input_dim=3, output_dim=2), ex)
    with pytest.raises(InputError, match="target dim"):
        train(small_config(input_dim=2, output_dim=5), ex)


# --------------------------------------------------------------- inference

def test_predict_all_matches_forward_and_handles_duplicates():
    cfg = small_config(input_dim=3, output_dim=4, seed=9)
    model = init_model(cfg)
    entries = {"a": np.array([1.0, 2.0, 3.0]), "b": np.array([-1.0, 0.5, 2.0])}
    table = EmbeddingTable(dimension=3, entries=entries)
    preds = predict_all(model, table, ["a", "b", "a"])
    assert preds.shape == (3, 4)
    np.testing.assert_allclose(preds.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(preds[0], preds[2])
    np.testing.assert_allclose(preds[1], forward(model, entries["b"]), atol=1e-15)


def test_predict_all_empty_word_list():
    cfg = small_config(output_dim=3)
    preds = predict_all(init_model(cfg), EmbeddingTable(dimension=4, entries={}), [])
    assert preds.shape == (0, 3)


# -------------------------------------------------------------- checkpoint

def test_checkpoint_roundtrip_is_bitwise(tmp_path):
    ex = toy_examples()
    cfg = MlpConfig(input_dim=2, output_dim=2, hidden_dim=4, dropout_rate=0.3,
                    learning_rate=0.01, epochs=5, batch_size=2, momentum=0.9, seed=13)
    model, _ = train(cfg, ex)
    p = tmp_path / "model.json"
    save_model(model, p)
    back = load_model(p)
    assert back.config == cfg
    np.testing.assert_array_equal(back.w1, model.w1)
    np.testing.assert_array_equal(back.b1, model.b1)
    np.testing.assert_array_equal(back.w2, model.w2)
    np.testing.assert_array_equal(back.b2, model.b2)


def test_checkpoint_shape_mismatch_rejected(tmp_path):
    cfg = small_config()
    model = init_model(cfg)
    p = tmp_path / "model.json"
    save_model(model, p)
    text = p.read_text(encoding="utf-8").replace('"hidden_dim": 5', '"hidden_dim": 6')
    p.write_text(text, encoding="utf-8")
    with pytest.raises(InputError, match="shapes"):
        load_model(p)

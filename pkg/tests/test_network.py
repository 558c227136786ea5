"""Connectome loading and synthetic generation."""

import numpy as np
import pytest

from fractalfc import ConfigError, Connectome, generate_synthetic_connectome, load_connectome


def write(tmp_path, text, name="conn.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestConnectomeType:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            Connectome(np.array([[0.0, -1.0], [1.0, 0.0]]), ("a", "b"))

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError):
            Connectome(np.array([[1.0, 1.0], [1.0, 0.0]]), ("a", "b"))

    def test_rejects_single_node(self):
        with pytest.raises(ValueError):
            Connectome(np.zeros((1, 1)), ("a",))


class TestLoadConnectome:
    def test_well_formed(self, tmp_path):
        path = write(tmp_path, "0,1,0.5\n2,0,1\n0.25,3,0\n")
        c = load_connectome(path)
        assert c.n == 3
        assert c.weights[1, 0] == 2.0

    def test_label_header(self, tmp_path):
        path = write(tmp_path, '"V1","V2"\n0,1\n2,0\n')
        c = load_connectome(path)
        assert c.labels == ("V1", "V2")

    def test_not_square(self, tmp_path):
        path = write(tmp_path, "0,1,2,3\n1,0,2,3\n2,1,0,3\n")
        with pytest.raises(ConfigError, match=r"matrix not square \(3×4\)"):
            load_connectome(path)

    def test_negative_entry_names_cell(self, tmp_path):
        path = write(tmp_path, "0,1,1\n1,0,-0.2\n1,1,0\n")
        with pytest.raises(ConfigError, match="row 2, column 3"):
            load_connectome(path)

    def test_non_numeric_names_cell(self, tmp_path):
        path = write(tmp_path, "0,1\nx,0\n")
        with pytest.raises(ConfigError, match="row 2, column 1"):
            load_connectome(path)

    def test_nan_rejected(self, tmp_path):
        path = write(tmp_path, "0,nan\n1,0\n")
        with pytest.raises(ConfigError, match="NaN"):
            load_connectome(path)

    def test_nonzero_diagonal_warns_and_zeroes(self, tmp_path):
        path = write(tmp_path, "0.5,1\n1,0\n")
        with pytest.warns(UserWarning, match="diagonal"):
            c = load_connectome(path)
        assert c.weights[0, 0] == 0.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_connectome(tmp_path / "absent.csv")


class TestGenerateSynthetic:
    def test_full_density_two_nodes(self):
        c = generate_synthetic_connectome(2, 1.0, 1, seed=0)
        assert c.weights[0, 1] > 0 and c.weights[1, 0] > 0

    def test_deterministic(self):
        a = generate_synthetic_connectome(40, 0.2, 4, seed=9)
        b = generate_synthetic_connectome(40, 0.2, 4, seed=9)
        assert np.array_equal(a.weights, b.weights)

    def test_realized_density(self):
        densities = []
        for s in range(20):
            c = generate_synthetic_connectome(40, 0.2, 4, seed=s)
            n = c.n
            densities.append(np.count_nonzero(c.weights) / (n * (n - 1)))
        assert np.mean(densities) == pytest.approx(0.2, abs=0.05)

    def test_modular_contrast(self):
        # Within-module edges should be denser than between-module edges.
        within = between = w_total = b_total = 0
        for s in range(10):
            c = generate_synthetic_connectome(40, 0.2, 4, seed=100 + s)
            module = np.arange(40) * 4 // 40
            same = module[:, None] == module[None, :]
            off = ~np.eye(40, dtype=bool)
            within += np.count_nonzero(c.weights[same & off])
            w_total += np.count_nonzero(same & off)
            between += np.count_nonzero(c.weights[~same])
            b_total += np.count_nonzero(~same & off)
        assert within / w_total > 2.5 * (between / b_total)

    def test_no_isolated_nodes(self):
        for s in range(10):
            c = generate_synthetic_connectome(12, 0.15, 3, seed=s)
            degree = c.weights.sum(axis=0) + c.weights.sum(axis=1)
            assert np.all(degree > 0)

    def test_zero_diagonal(self):
        c = generate_synthetic_connectome(10, 0.5, 2, seed=3)
        assert np.all(np.diag(c.weights) == 0)

    def test_argument_validation(self):
        with pytest.raises(ConfigError):
            generate_synthetic_connectome(1, 0.5, 1, seed=0)
        with pytest.raises(ConfigError):
            generate_synthetic_connectome(5, 0.0, 1, seed=0)
        with pytest.raises(ConfigError):
            generate_synthetic_connectome(5, 1.5, 1, seed=0)

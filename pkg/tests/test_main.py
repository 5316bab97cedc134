# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

from unittest.mock import patch

import pytest

import coreason_affine
from coreason_affine.main import main


def test_main_exits_with_cli_status() -> None:
    """main() hands the command-line status to sys.exit."""
    with patch("coreason_affine.main.cli_main", return_value=2):
        with pytest.raises(SystemExit) as exc:
            main()
    assert exc.value.code == 2


def test_package_metadata() -> None:
    """The package exposes its version."""
    assert coreason_affine.__version__ == "0.1.0"

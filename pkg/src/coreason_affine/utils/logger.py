# Copyright (c) 2025 CoReason, Inc.
#
# This software is proprietary and dual-licensed.
# Licensed under the Prosperity Public License 3.0 (the "License").
# A copy of the license is available at https://prosperitylicense.com/versions/3.0.0
# For details, see the LICENSE file.
# Commercial use beyond a 30-day trial requires a separate license.
#
# Source Code: https://github.com/CoReason-AI/coreason_affine

import sys

from loguru import logger

from coreason_affine.config import get_settings

__all__ = ["logger"]

_settings = get_settings()

# Remove default handler
logger.remove()

# Sink 1: Stderr (Human-readable); stdout is reserved for command output
logger.add(
    sys.stderr,
    level=_settings.LOG_LEVEL,
    format=(
        "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | "
        "<level>{level: <8}</level> | "
        "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
        "<level>{message}</level>"
    ),
)

# Ensure logs directory exists
log_path = _settings.LOG_DIR
if not log_path.exists():
    log_path.mkdir(parents=True, exist_ok=True)  # pragma: no cover

# Sink 2: File (JSON, Rotation, Retention)
logger.add(
    str(log_path / "app.log"),
    rotation="500 MB",
    retention="10 days",
    serialize=True,
    enqueue=True,
    level=_settings.LOG_LEVEL,
)

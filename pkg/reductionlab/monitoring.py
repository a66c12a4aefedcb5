"""
Process-level CPU and memory sampling of the running suite using psutil.

Each reduced-model query scans a lattice ball, so the property suite records
what its batch cost next to its verdicts.
"""

from __future__ import annotations

import importlib.util
import os
import threading
from datetime import datetime, timezone
from typing import Dict, List, Optional

from .models import ResourceArtifact


def _ensure_psutil_available() -> None:
    if importlib.util.find_spec("psutil") is None:
        raise RuntimeError("psutil is required for ResourceMonitor but is not installed in the environment.")


class ResourceMonitor:
    """Samples one process on a background thread until stopped."""

    name = "psutil"

    def __init__(self, sample_interval: float = 0.5) -> None:
        if sample_interval <= 0:
            raise ValueError(f"sample interval must be positive, got {sample_interval}")
        self.sample_interval = sample_interval
        self._stop_event = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self._samples: List[Dict[str, float]] = []
        self._pid: Optional[int] = None

    def start(self, pid: Optional[int] = None) -> None:
        _ensure_psutil_available()
        self._pid = os.getpid() if pid is None else pid
        self._samples = []
        self._stop_event.clear()
        self._thread = threading.Thread(target=self._sample_loop, name="resource-monitor", daemon=True)
        self._thread.start()

    def stop(self) -> ResourceArtifact:
        self._stop_event.set()
        if self._thread:
            self._thread.join()
            self._thread = None
        return ResourceArtifact(
            monitor=self.name,
            timestamp=datetime.now(timezone.utc).isoformat(),
            metrics=self._summarize(),
        )

    def _sample_loop(self) -> None:
        import psutil  # noqa: WPS433 - optional at import time

        process = psutil.Process(self._pid)
        process.cpu_percent(interval=None)
        while True:
            memory = process.memory_info()
            self._samples.append(
                {
                    "cpu_percent": process.cpu_percent(interval=None),
                    "rss_bytes": float(memory.rss),
                    "vms_bytes": float(memory.vms),
                }
            )
            if self._stop_event.wait(self.sample_interval):
                break

    def _summarize(self) -> Dict[str, float]:
        if not self._samples:
            return {"sample_count": 0.0}

        cpu_values = [sample["cpu_percent"] for sample in self._samples]
        return {
            "sample_count": float(len(self._samples)),
            "cpu_percent_avg": float(sum(cpu_values) / len(cpu_values)),
            "cpu_percent_max": float(max(cpu_values)),
            "rss_bytes_max": float(max(sample["rss_bytes"] for sample in self._samples)),
            "vms_bytes_max": float(max(sample["vms_bytes"] for sample in self._samples)),
        }

"""
Check Tracker für den Service
Verfolgt laufende Theorem-Checks in-memory
"""
from typing import Dict, List, Optional
from datetime import datetime, timezone


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class CheckTracker:
    def __init__(self):
        self.jobs: Dict[str, dict] = {}

    def create_job(self, job_id: str, theorems: List[str]):
        """Neuen Job anlegen, ein Schritt pro Theorem"""
        self.jobs[job_id] = {
            'job_id': job_id,
            'status': 'processing',
            'current_step': theorems[0] if theorems else None,
            'steps': {name: {'status': 'pending'} for name in theorems},
            'reports': [],
            'created_at': _now(),
            'updated_at': _now(),
        }

    def update_step(self, job_id: str, step: str, status: str, message: Optional[str] = None):
        if job_id not in self.jobs:
            return

        job = self.jobs[job_id]
        job['current_step'] = step
        job['steps'][step]['status'] = status
        if message:
            job['steps'][step]['message'] = message
        job['updated_at'] = _now()

    def add_report(self, job_id: str, report: dict):
        if job_id not in self.jobs:
            return
        self.jobs[job_id]['reports'].append(report)
        self.jobs[job_id]['updated_at'] = _now()

    def complete_job(self, job_id: str, passed: bool):
        """Job abschließen; passed = alle Theoreme ohne Fehler"""
        if job_id not in self.jobs:
            return

        self.jobs[job_id]['status'] = 'completed'
        self.jobs[job_id]['passed'] = passed
        self.jobs[job_id]['current_step'] = None
        self.jobs[job_id]['updated_at'] = _now()

    def fail_job(self, job_id: str, error: str):
        if job_id not in self.jobs:
            return

        self.jobs[job_id]['status'] = 'failed'
        self.jobs[job_id]['error'] = error
        self.jobs[job_id]['updated_at'] = _now()

    def get_job(self, job_id: str) -> Optional[dict]:
        return self.jobs.get(job_id)


# Global instance
check_tracker = CheckTracker()

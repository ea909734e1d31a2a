"""Utility helpers for the plan_x package."""

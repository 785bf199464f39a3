#!/usr/bin/env python3
"""
Packaging for linfdiff
"""

from pathlib import Path

from setuptools import find_packages, setup

HERE = Path(__file__).parent
DEV_TOOLS = ("pytest", "pytest-cov", "black", "flake8")


def read_requirements():
    """Split requirements.txt into runtime and development pins"""
    runtime, dev = [], []
    path = HERE / "requirements.txt"
    if not path.exists():
        return runtime, dev
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name = line.split(">")[0].split("=")[0].split("<")[0].strip()
        (dev if name in DEV_TOOLS else runtime).append(line)
    return runtime, dev


install_requires, dev_requires = read_requirements()
readme = HERE / "README.md"

setup(
    name="linfdiff",
    version="1.0.0",
    description="Exact differentiation of simplicial Lie algebras and formal ∞-groups into L∞ algebras",
    long_description=readme.read_text(encoding="utf-8") if readme.exists() else "",
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=install_requires,
    extras_require={"dev": dev_requires},
    python_requires=">=3.10",
    entry_points={"console_scripts": ["linfdiff=src.main:main"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="L-infinity algebra simplicial Lie algebra Dold-Kan exact arithmetic",
)

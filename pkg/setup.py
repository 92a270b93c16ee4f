"""
Setup script for Grmbot package.

Grmbot is a verification toolkit for the weights of generalized Reed-Muller
codes: closed-form weight formulas with provenance, explicit codeword
constructors, exhaustive oracles and Robot Framework integration.
"""
from setuptools import setup, find_packages

# Read the README file for long description
try:
    with open("README.md", "r", encoding="utf-8") as fh:
        long_description = fh.read()
except FileNotFoundError:
    long_description = """Grmbot computes and cross-checks the first three weights of
    generalized Reed-Muller codes R_q(r,m): closed forms, constructed codewords and
    exhaustive oracles, with a command line tool and a Robot Framework library."""

setup(
    name="grmbot",
    use_scm_version=True,
    setup_requires=["setuptools_scm"],
    packages=find_packages(include=["grmbot", "grmbot.*"]),
    include_package_data=True,
    install_requires=[
        "robotframework>=6.0",
        "sqlalchemy",
        "pyyaml",
        "numpy",
        "sympy",
    ],
    extras_require={
        "dev": ["build", "pdoc3", "ruff", "bandit", "radon", "safety", "pytest"],
    },
    entry_points={
        "console_scripts": [
            "grmw=grmbot.cli:main",
        ],
    },
    author="Thibault SCIRE",
    author_email="thibault.scire@outlook.com",
    description="Weight verification toolkit for generalized Reed-Muller codes with Robot Framework integration",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=[
        "coding-theory",
        "reed-muller",
        "finite-fields",
        "hamming-weight",
        "hyperplane-arrangements",
        "verification",
        "robot-framework",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Software Development :: Libraries :: Python Modules",
        "Framework :: Robot Framework",
        "Framework :: Robot Framework :: Library",
    ],
    license="MIT",
    python_requires=">=3.9",
)

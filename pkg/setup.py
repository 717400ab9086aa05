#!/usr/bin/env python

from setuptools import setup, find_packages

setup(
    name="mfdk",
    version="0.1.0",
    description="Exact computations with matrix factorizations and affine Lagrangian correspondences.",
    long_description=(
        "Exact computations with matrix factorizations, their 2-category, the functor to affine "
        "Lagrangian correspondences and the values of the resulting two-dimensional field theory."
    ),
    license="MIT",
    classifiers=[
        "Development Status :: 2 - Pre-Alpha",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Developers",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.8",
    install_requires=[
        "regex==2023.10.3",
        "PyYAML>=6.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "sympy>=1.12",
        ],
    },
    scripts=["mfdk/bin/mfdk"],
)

from pathlib import Path

from setuptools import setup, find_packages

VERSION = (Path(__file__).parent / "VERSION").read_text().strip()

# Read README for long description
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="equiform-core",
    version=VERSION,
    packages=find_packages(where='packages/core', include=['equiform_core*']),
    package_dir={'': 'packages/core'},
    include_package_data=True,
    package_data={'equiform_core': ['config/*.yaml']},
    python_requires=">=3.9",
    install_requires=[
        # Configuration
        "pyyaml>=6.0",
        "python-dotenv>=0.19.0",

        # Parameter files and reports
        "pydantic>=2.0",

        # Numerics
        "numpy>=1.22",
        "scipy>=1.9",
    ],
    extras_require={
        # Development dependencies
        "dev": [
            "pytest>=7.0",
            "hypothesis>=6.0",
            "black>=22.0",
            "flake8>=4.0",
        ],
    },
    author="Equiform Core Authors",
    author_email="",
    description="Scalar curvature of kinematic 3-surfaces generated by equiform motions of a sphere in E^7",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    keywords="differential-geometry, kinematics, scalar-curvature, fourier, exact-arithmetic",
    entry_points={
        "console_scripts": [
            "equiform=equiform_core.cli:main",
        ],
    },
)

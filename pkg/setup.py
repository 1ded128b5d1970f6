import os
from setuptools import setup, find_packages

# Get the long description from the README file
here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="twowaygym",
    packages=find_packages(exclude=["tests", "tests.*"]),
    version="0.1.0",
    description="TwoWayGym: A workbench for two-way finite automata, graph reachability and their reductions",
    author="TwoWayGym developers",
    license="MIT",
    long_description=long_description,
    long_description_content_type="text/markdown",
    package_data={"twowaygym": ["caps.json", "regression.json"]},
    install_requires=[
        "numpy>=1.24.4",
        "pandas>=2.2.2",
        "networkx>=3.3",
        "sympy>=1.12",
        "graphviz>=0.20.3",
    ],
    extras_require={
        "dev": [
            "black>=24.4.2",
            "pytest>=8.2.1",
            "pytest-cov>=5.0.0",
            "hypothesis>=6.103.1",
        ],
    },
    entry_points={
        "console_scripts": [
            "twowaygym=twowaygym.cli:main",
        ],
    },
    python_requires='>=3.10',
    classifiers=[
        "Programming Language :: Python :: 3.11",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)

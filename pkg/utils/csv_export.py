"""
결과 파일 내보내기 유틸리티
관측량 표를 CSV 로 저장하고 파일별 요약, summary.json, gnuplot 스크립트를 만듭니다.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'
LINE_TERMINATOR = '\n'


@dataclass(frozen=True)
class FileSummary:
    """저장된 CSV 한 개의 요약"""

    path: Path
    rows: int
    stats: Dict[str, Dict[str, float]]

    def describe(self) -> str:
        parts = [f"{name}: min={s['min']:.6g}, max={s['max']:.6g}, mean={s['mean']:.6g}"
                 for name, s in self.stats.items()]
        return f"{self.path.name} ({self.rows}행) " + '; '.join(parts)


@dataclass(frozen=True)
class PlotSpec:
    """gnuplot 에서 그릴 열 (1부터 시작하는 번호)"""

    filename: str
    columns: Sequence[int]
    curves: Sequence[str]
    title: str


def format_time(T: float) -> str:
    """파일 이름용 시간 표기 (예: 6.2999)"""
    return f"{T:.6g}"


class ResultWriter:
    """출력 디렉토리에 결과 파일을 쓰는 클래스"""

    def __init__(self, output_dir: Union[str, Path]):
        """
        결과 기록기 초기화

        Args:
            output_dir (str | Path): 출력 디렉토리 (없으면 생성)

        Raises:
            OSError: 디렉토리를 만들거나 쓸 수 없는 경우
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        if not self.output_dir.is_dir():
            raise NotADirectoryError(f"출력 경로가 디렉토리가 아닙니다: {self.output_dir}")
        self.summaries: List[FileSummary] = []
        self.plots: List[PlotSpec] = []

    def write_frame(self, filename: str, frame: pd.DataFrame, plot_columns: Optional[Sequence[str]] = None,
                    title: str = '') -> FileSummary:
        """
        표를 CSV 로 저장합니다 (헤더 포함, 17 유효숫자, Unix 줄바꿈).

        Args:
            filename (str): 파일 이름
            frame (pd.DataFrame): 'curve' 열을 가진 긴 형식 표
            plot_columns (Sequence[str]): gnuplot 축으로 쓸 열 이름
            title (str): gnuplot 그래프 제목

        Returns:
            FileSummary: 행 수와 수치 열 통계
        """
        path = self.output_dir / filename
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator=LINE_TERMINATOR)

        numeric = frame.select_dtypes('number')
        stats = {name: {'min': float(numeric[name].min()), 'max': float(numeric[name].max()),
                        'mean': float(numeric[name].mean())}
                 for name in numeric.columns}
        summary = FileSummary(path=path, rows=len(frame), stats=stats)
        self.summaries.append(summary)

        if plot_columns:
            indices = [list(frame.columns).index(name) + 1 for name in plot_columns]
            curves = list(dict.fromkeys(frame['curve'])) if 'curve' in frame.columns else []
            self.plots.append(PlotSpec(filename=filename, columns=indices, curves=curves,
                                       title=title or filename))

        logger.info(f"결과 저장됨: {path} ({len(frame)}행)")
        return summary

    def write_json(self, filename: str, data: Dict[str, Any]) -> Path:
        """JSON 파일을 저장합니다."""
        path = self.output_dir / filename
        with open(path, 'w', encoding='utf-8', newline=LINE_TERMINATOR) as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
            f.write(LINE_TERMINATOR)
        logger.info(f"요약 저장됨: {path}")
        return path

    def write_gnuplot(self, filename: str = 'plot.gp') -> Optional[Path]:
        """
        저장된 CSV 를 그리는 gnuplot 스크립트를 만듭니다.

        Returns:
            Optional[Path]: 스크립트 경로 (그릴 파일이 없으면 None)
        """
        if not self.plots:
            return None

        lines = ["set datafile separator ','", "set key outside", "set terminal pngcairo size 900,600"]
        for spec in self.plots:
            stem = Path(spec.filename).stem
            lines.append(f"set output '{stem}.png'")
            lines.append(f"set title '{spec.title}'")
            command = 'splot' if len(spec.columns) == 3 else 'plot'
            axes = ':'.join(f'{c}' for c in spec.columns[:-1])
            value = spec.columns[-1]
            names = ' '.join(spec.curves)
            lines.append(f"{command} for [c in \"{names}\"] '{spec.filename}' skip 1 "
                         f"using {axes}:(strcol(1) eq c ? ${value} : NaN) with lines title c")
        lines.append("unset output")

        path = self.output_dir / filename
        with open(path, 'w', encoding='utf-8', newline=LINE_TERMINATOR) as f:
            f.write(LINE_TERMINATOR.join(lines) + LINE_TERMINATOR)
        logger.info(f"gnuplot 스크립트 저장됨: {path}")
        return path
